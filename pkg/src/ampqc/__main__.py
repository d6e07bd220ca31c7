import sys

from ampqc.cli import main

sys.exit(main())
