import sys

from orbilef.cli import main

sys.exit(main())
