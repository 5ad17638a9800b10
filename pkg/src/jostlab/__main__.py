import sys

from jostlab.cli import main

sys.exit(main())
