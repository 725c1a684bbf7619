import os
import sys
from pathlib import Path

import django

sys.path.insert(0, str(Path(__file__).resolve().parent / "test_app"))
os.environ.setdefault("DJANGO_SETTINGS_MODULE", "test_app.settings")
django.setup()
