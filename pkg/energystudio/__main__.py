import sys

from energystudio.cli.main import main

sys.exit(main())
