import sys

from smartcane.cli import main

sys.exit(main())
