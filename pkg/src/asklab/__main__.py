import sys

from asklab.shell.cli import main

sys.exit(main())
