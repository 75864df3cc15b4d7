import sys

from cyclicpoly.cli import main

sys.exit(main())
