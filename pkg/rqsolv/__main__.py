import sys

from rqsolv.cli import main

sys.exit(main())
