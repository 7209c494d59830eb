import sys

from raganet.cli.main import main

sys.exit(main())
