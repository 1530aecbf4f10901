import sys

from fle.cli import main

sys.exit(main())
