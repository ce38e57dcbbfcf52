import sys

from citeimpact.cli import main

sys.exit(main())
