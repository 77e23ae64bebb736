import sys

from mchan.cli import main

sys.exit(main())
