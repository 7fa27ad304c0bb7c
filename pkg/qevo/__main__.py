import sys

from qevo.cli import main

sys.exit(main())
