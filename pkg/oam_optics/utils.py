"Utility functions shared by the oam_optics modules"
import os
import json
import logging
from datetime import datetime
from oam_optics.exceptions import RegimeError


LOGGER_NAME = 'oam_optics'


def create_log(log_dir=None, level=logging.INFO):
    """Configure the package logger.
    Parameters
    ----------
    log_dir : str
        (optional) directory where a timestamped log file will be written
    level : int
        logging level of the console handler
    Returns
    -------
    logger : logging.Logger
        the configured 'oam_optics' logger
    """
    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(logging.DEBUG)
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()

    formatter = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s')
    # console handler only reports the requested level
    ch = logging.StreamHandler()
    ch.setLevel(level)
    ch.setFormatter(formatter)
    logger.addHandler(ch)

    if log_dir is not None:
        if not os.path.isdir(log_dir):
            os.makedirs(log_dir)
        dt_string = datetime.now().strftime("%d-%m-%Y_%H:%M:%S")
        fh = logging.FileHandler(os.path.join(
            log_dir, 'oam_optics_{}.log'.format(dt_string)))
        fh.setLevel(logging.DEBUG)
        fh.setFormatter(formatter)
        logger.addHandler(fh)

    return logger


def canonical_json(document):
    "Serialize a JSON document with sorted keys and shortest round-trip floats."
    return (json.dumps(document, sort_keys=True, indent=2, allow_nan=False) + '\n').encode('utf-8')


def is_power_of_two(value):
    return isinstance(value, int) and value >= 1 and (value & (value - 1)) == 0


def log2_int(value):
    "Exact base-2 logarithm of a power of two."
    if not is_power_of_two(value):
        raise RegimeError('{} is not a power of two'.format(value))
    return value.bit_length() - 1


def check_power_of_two(name, value):
    if not is_power_of_two(value):
        raise RegimeError('{0} must be a power of two, got {1}'.format(name, value))
    return value
