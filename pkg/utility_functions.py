"""
Utility Functions Module

Filesystem helpers shared by the command line front end and the snapshot writer.
"""

import os
import re

_UNSAFE = re.compile(r'[\\/:*?"<>|\s]+')


def sanitize_filename(text):
    """
    Turn a subcommand path such as "classify nse-beltrami" into a file name prefix.

    Runs of path separators, shell metacharacters and whitespace collapse to one "-".

    Returns:
        str: The prefix, or "unnamed" when nothing usable remains
    """
    return _UNSAFE.sub('-', text or '').strip('-') or "unnamed"


def ensure_directory(directory_path, logger=None):
    """
    Create a results or log directory if it is missing.

    Args:
        directory_path (str): Target directory; "" stands for the working directory
        logger (logging.Logger, optional): Receives a debug line, or the error on failure

    Returns:
        bool: Whether the directory is now usable
    """
    if directory_path and not os.path.isdir(directory_path):
        try:
            os.makedirs(directory_path, exist_ok=True)
        except OSError as e:
            if logger:
                logger.error(f"Cannot create directory {directory_path}: {e}")
            return False
        if logger:
            logger.debug(f"Created directory {directory_path}")
    return True


def write_text_output(path, text, logger=None):
    """
    Write CSV text with LF line endings, creating parent directories.

    Raises:
        OSError: if the parent directory cannot be created
    """
    parent = os.path.dirname(os.path.abspath(path))
    if not ensure_directory(parent, logger):
        raise OSError(f"Cannot create output directory {parent}")
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
    if logger:
        logger.info(f"Wrote {len(text)} characters to {path}")
    return path
