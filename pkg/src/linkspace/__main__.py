"""
Allow running the package directly with: python -m linkspace
"""

from . import main

if __name__ == "__main__":
    main()
