import sys

from drawext.cli import main

sys.exit(main())
