"""Main entry point for the code-lattice command line."""

import logging
import sys
from collections.abc import Sequence
from typing import Optional


from codelattice.cli import CodeLatticeCLI, EXIT_FAILED
from codelattice.config import AppConfig, load_config, setup_logging, validate_config


logger = logging.getLogger(__name__)


class CodeLatticeApplication:
    """Main application class for the code-lattice toolkit."""

    def __init__(self, config: Optional[AppConfig] = None) -> None:
        """Initialize the application.

        Args:
            config: Optional pre-loaded configuration. If None, loads from environment.
        """
        self.config = config or load_config()
        self.cli: Optional[CodeLatticeCLI] = None

    def initialize(self) -> None:
        """Validate the configuration and set up logging.

        Raises:
            ValueError: If configuration is invalid.
        """
        if not validate_config(self.config):
            raise ValueError("Invalid configuration")

        setup_logging(self.config.logging)
        self.cli = CodeLatticeCLI(self.config)
        logger.debug("Code-lattice application initialized")

    def run(self, argv: Sequence[str]) -> int:
        """Run one command and return its exit status."""
        if self.cli is None:
            self.initialize()
        assert self.cli is not None
        return self.cli.run(argv)


def main() -> None:
    """Main entry point."""
    try:
        app = CodeLatticeApplication()
        status = app.run(sys.argv[1:])
    except Exception as e:
        logger.error(f"Fatal error: {e}", exc_info=True)
        sys.exit(EXIT_FAILED)
    sys.exit(status)


if __name__ == "__main__":
    main()
