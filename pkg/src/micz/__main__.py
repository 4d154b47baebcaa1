import sys

from micz.cli import main

sys.exit(main())
