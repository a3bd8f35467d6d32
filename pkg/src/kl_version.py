#!/usr/bin/python
# --------------------------------------------------------------------------
#   kl_version.py - The koutlab version number.

#   Version: [major].[minor].[patch]-[build/beta/rc]

# --------------------------------------------------------------------------

__version__ = '1.0.0-beta'
__build__ = 12

# --------------------------------------------------------------------------
