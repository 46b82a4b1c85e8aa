from dotenv import load_dotenv

load_dotenv()

from controllers.cli_controller import cli
from configuration.configuration import logger

if __name__ == "__main__":
    logger.debug("🚀 Starting face-ring toolkit")
    cli()
