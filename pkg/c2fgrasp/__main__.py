import sys

from c2fgrasp.cli import main

sys.exit(main())
