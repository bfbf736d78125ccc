"""nm-qlle: quasi-curvature LLE on landmarks with an ELM explicit map."""

import logging
import os
from pathlib import Path

from dotenv import load_dotenv

# Set up logging
logger = logging.getLogger(__name__)

# Load environment variables from .env file
env_path = Path(__file__).parent.parent / '.env'
if env_path.exists():
    logger.info(f"Loading environment variables from {env_path}")
    load_dotenv(dotenv_path=env_path, override=True)
else:
    logger.debug(f".env file not found at {env_path}. Using system environment variables.")

# BLAS reads these once, so they have to be in place before numpy is imported
if threads := os.getenv("QLLE_THREADS"):
    if threads.isdigit() and int(threads) > 0:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, threads)
    else:
        logger.warning(f"Ignoring QLLE_THREADS={threads!r}: expected a positive integer")

from .graph import NmQllePipeline, QllePipeline, fit_nm_qlle, fit_qlle

__all__ = ["NmQllePipeline", "QllePipeline", "fit_nm_qlle", "fit_qlle"]
