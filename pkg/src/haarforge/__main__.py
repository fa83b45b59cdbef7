import sys

from haarforge.cli import main

sys.exit(main())
