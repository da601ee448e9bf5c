"""Run the command line interface via ``python -m flowescape``."""

import sys

from .cli import main

sys.exit(main())
