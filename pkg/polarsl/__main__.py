"""Allow `python -m polarsl`."""
import sys

from .cli import main

sys.exit(main())
