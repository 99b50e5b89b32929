"""
Entry point: ``python -m src <command>``
"""
from src.cli import main

if __name__ == '__main__':
    main()
