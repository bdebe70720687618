# cle_integrability/__main__.py
import sys

from cle_integrability.run import main

sys.exit(main())
