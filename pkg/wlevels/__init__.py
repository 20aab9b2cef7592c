"""
W-Algebra Level Classification Package
Exact classification of collapsing and conformal levels of minimal W-algebras,
with ab initio checks of the underlying lambda-bracket identities.
"""
import os
import logging
from pathlib import Path
from dotenv import load_dotenv

load_dotenv()

__version__ = '0.4.0'

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

# Configure logging
logging.basicConfig(
    level=os.getenv('WLEVELS_LOG_LEVEL', 'WARNING').upper(),
    format=LOG_FORMAT,
)
logger = logging.getLogger(__name__)

# Base directory for the project
BASE_DIR = Path(__file__).resolve().parent.parent
CONFIG_DIR = BASE_DIR / 'config'
GOLDEN_DIR = BASE_DIR / os.getenv('WLEVELS_GOLDEN_DIR', 'goldens')
