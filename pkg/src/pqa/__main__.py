"""Allow running as ``python -m pqa``."""

from pqa.main import cli as main  # noqa: F401  console script target

if __name__ == "__main__":
    main()
