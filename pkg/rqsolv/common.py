import os
import sys
import json
import logging

import psutil

'''Utility methods and settings used by other modules
   '''

LOG_FORMAT = 'LOG|%(asctime)s|%(levelname)s  %(message)s'
LOG_DATE_FORMAT = '%d-%b-%Y %H:%M:%S'


class RqsolvException(Exception):
    """Base class of every error raised by rqsolv."""
    pass


class RqsolvWarning(Warning):
    """Rqsolv warning."""
    pass


def env_int(name, default, logger=None):
    '''Read a positive integer setting from the environment

       Parameters
       ==========
       name: string - environment variable
       default: int - value used when the variable is unset or malformed
       '''
    raw = os.environ.get(name)
    if raw is None or raw.strip() == '':
        return default
    try:
        value = int(raw)
    except ValueError:
        value = 0
    if value < 1:
        (logger or logging.getLogger(__name__)).warning(
            "Ignoring %s=%r, expected a positive integer; using %d" % (name, raw, default))
        return default
    return value


DEFAULT_BUDGET_DEPTH = env_int('RQSOLV_BUDGET_DEPTH', 64)
DEFAULT_BUDGET_LENGTH = env_int('RQSOLV_BUDGET_LENGTH', 10 ** 6)
DEFAULT_BUDGET_CALLS = env_int('RQSOLV_BUDGET_CALLS', 10 ** 7)
DEFAULT_BALL_VERTICES = env_int('RQSOLV_BALL_VERTICES', 10 ** 5)
DEFAULT_THREADS = env_int('RQSOLV_THREADS', 1)


def init_logging(level=logging.INFO, stream=None):
    logging.basicConfig(level=level, stream=stream or sys.stderr,
                        format=LOG_FORMAT, datefmt=LOG_DATE_FORMAT)


def peak_rss_mb():
    # ru_maxrss is not portable, psutil gives the current resident set instead
    try:
        return round(psutil.Process(os.getpid()).memory_info().rss / (1024.0 * 1024.0), 1)
    except psutil.Error:
        return None


def json_dump(input_object, output_file=None):
    text = json.dumps(input_object, sort_keys=False, ensure_ascii=False)
    if output_file is None:
        return text
    with open(output_file, 'w') as handle:
        handle.write(text + '\n')
    return text


def json_load(input_file):
    with open(input_file) as handle:
        return json.load(handle)
