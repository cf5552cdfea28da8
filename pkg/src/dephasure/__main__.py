import sys

from dephasure.cli import main

sys.exit(main())
