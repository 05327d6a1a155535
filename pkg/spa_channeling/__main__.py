"""Allow running as: uv run python -m spa_channeling <command> [options]"""

import subprocess
import sys
from pathlib import Path

if __name__ == "__main__":
    main_py = Path(__file__).parent.parent / "main.py"
    sys.exit(subprocess.run([sys.executable, str(main_py), *sys.argv[1:]]).returncode)
