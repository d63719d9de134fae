import sys

from mibs.cli import main

sys.exit(main())
