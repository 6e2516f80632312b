import logging
import sys
from pathlib import Path
from typing import Optional

# Global flag for verbose output (set by geoflow.py)
VERBOSE = False

CONSOLE_FORMAT = '%(message)s'
FILE_FORMAT = '%(asctime)s [%(levelname)s] %(message)s'
FILE_DATEFMT = '%Y-%m-%d %H:%M:%S'


def logInfo(message):
    # Only use logging - handler will print to console
    logging.info(message)

def logError(message):
    logging.error(message)

def logWarn(message):
    logging.warning(message)

def logDebug(message):
    logging.debug(message)


def configure_logging(verbose: bool = False, log_file: Optional[Path] = None) -> Optional[Path]:
    """Attach the stderr console handler and, optionally, the run log file.

    Calling it again replaces the handlers it installed earlier instead of
    stacking duplicates. Returns the log file actually opened, or None.
    """
    global VERBOSE
    VERBOSE = verbose
    level = logging.DEBUG if verbose else logging.INFO

    root_logger = logging.getLogger()
    for handler in list(root_logger.handlers):
        if getattr(handler, '_geoflow', False):
            root_logger.removeHandler(handler)
            handler.close()

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)
    console_handler.setFormatter(logging.Formatter(CONSOLE_FORMAT))
    console_handler._geoflow = True
    root_logger.addHandler(console_handler)
    root_logger.setLevel(level)

    if log_file is None:
        return None
    try:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file, encoding='utf-8')
    except OSError as e:
        logWarn(f"⚠️  Log file not writable ({log_file}): {e}")
        return None
    file_handler.setLevel(level)
    file_handler.setFormatter(logging.Formatter(FILE_FORMAT, FILE_DATEFMT))
    file_handler._geoflow = True
    root_logger.addHandler(file_handler)
    return log_file
