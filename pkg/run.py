#!/usr/bin/env python3
import sys
from pathlib import Path

sys.path.append(str(Path(__file__).parent))

if __name__ == "__main__":
    try:
        from src.application.main import main
    except ImportError as e:
        print(f"Error starting vcgkit: {e}", file=sys.stderr)
        sys.exit(1)
    sys.exit(main())
