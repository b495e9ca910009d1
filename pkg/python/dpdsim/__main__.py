import sys
from dpdsim.cli import main

sys.exit(main())
