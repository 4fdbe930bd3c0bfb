import sys

from rsum.cli import main

sys.exit(main())
