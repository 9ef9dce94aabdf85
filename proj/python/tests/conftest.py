import os
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parents[2]

# Build-tree package takes precedence over an installed wheel when ctest runs us.
if os.environ.get("NLFI_PYTHONPATH"):
    sys.path.insert(0, os.environ["NLFI_PYTHONPATH"])
