# Licensed under the MIT license. See LICENSE.md file in the project root for full license information.

import logging
import os


LOG_FORMAT = '%(asctime)s - %(levelname)s - %(funcName)s - %(message)s'


def _env_flag(name: str) -> bool:
    return os.getenv(name, 'false').lower() in ('true', '1', 't')


def setup_logger() -> logging.Logger:
    """
    Sets up a logger named 'qnn_reupload_logger' with INFO level. Console logging is enabled by the
    environment variable QNN_LOG_TO_CONSOLE and file logging by QNN_LOG_TO_FILE. If neither is set to a
    value that equates to 'true', the logger stays disabled. The function name is included in the
    log messages.

    :return: The logger instance.
    :rtype: logging.Logger
    """
    logger = logging.getLogger('qnn_reupload_logger')
    logger.setLevel(logging.INFO)

    # Disable by default
    logger.disabled = True

    formatter = logging.Formatter(LOG_FORMAT)

    if _env_flag('QNN_LOG_TO_FILE'):
        logger.disabled = False
        file_handler = logging.FileHandler('qnn_reupload.log', encoding='utf-8')
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    if _env_flag('QNN_LOG_TO_CONSOLE'):
        logger.disabled = False
        stream_handler = logging.StreamHandler()
        stream_handler.setFormatter(formatter)
        logger.addHandler(stream_handler)

    return logger


def enable_console_logging(level: int = logging.INFO) -> None:
    """
    Enables the global logger and makes sure it writes to the console.

    :param level: The logging level to use.
    :type level: int
    """
    logger.disabled = False
    logger.setLevel(level)
    for handler in logger.handlers:
        if isinstance(handler, logging.StreamHandler) and not isinstance(handler, logging.FileHandler):
            return
    stream_handler = logging.StreamHandler()
    stream_handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logger.addHandler(stream_handler)


# To enable console logging, set QNN_LOG_TO_CONSOLE=true before running, or pass --verbose to the CLI.
logger = setup_logger()
