"""
onionhash: layered password hash chains, legacy MD5 migration and
collision-propagation analysis
"""

__version__ = "0.1.0"
__license__ = "MIT"

from .logger import get_logger

# Initialize package-level logger
logger = get_logger(__name__)
logger.debug(f"onionhash v{__version__} initialized")
