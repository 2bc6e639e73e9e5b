"""`python3 -m poacert` is the console script without the install step."""

import sys

from .cli import main

sys.exit(main())
