import os
from pathlib import Path

# navconfig needs to locate the project root (and env/.env) before the
# package is imported.
os.environ.setdefault("SITE_ROOT", str(Path(__file__).resolve().parent.parent))
