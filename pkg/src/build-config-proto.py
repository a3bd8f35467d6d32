#!/usr/bin/python
# ---------------------------------------------------------------------------
#   build-config-proto.py - Write koutlab.conf.proto from the settings data
#       dictionary so the prototype never drifts from kl_config.py.

#   Run from the repo root: python src/build-config-proto.py
# ---------------------------------------------------------------------------

from pathlib import Path

import click

from kl_constants import Const
from kl_config import write_proto

# ---------------------------------------------------------------------------

@click.command()
@click.option( "-o", "--output", default=Const.Config_Proto, show_default=True, help="Prototype file to write" )

def do_main( output ):
    path = write_proto( Path( output ))
    print( f"Wrote {path}" )

# ---------------------------------------------------------------------------

if __name__ == '__main__':
    do_main()
