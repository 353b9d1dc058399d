import sys

from icoding.cli import main

sys.exit(main())
