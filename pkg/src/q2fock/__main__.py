import sys

from q2fock.cli import main

sys.exit(main())
