import os
import sys

# Allow running pytest from the repository root without an editable install.
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "pcm_amortized"))

collect_ignore = ["examples"]
