import sys

from memdeph.cli import main

sys.exit(main())
