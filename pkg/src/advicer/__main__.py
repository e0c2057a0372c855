import sys

from advicer.cli import main

sys.exit(main())
