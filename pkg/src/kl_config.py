#!/usr/bin/python
# ---------------------------------------------------------------------------
#   kl_config.py - Configuration settings, file and command line.

#   One flat configobj file, koutlab.conf by default, holds any of the items
#       in Settings_Dict. Command-line flags override the file, the file
#       overrides the defaults here. Values in the file are strings, or lists
#       for comma-separated values; val() converts them by 'type'.

#   Sequence values also accept a range 'a:b' (step 1) or 'a:b:step'.

#   Every output embeds resolved(), the full item -> value mapping actually
#       used, together with the seed.
# ---------------------------------------------------------------------------

from pathlib import Path

from configobj import ConfigObj, ConfigObjError

from kl_constants import Const
from kl_errors import KoutlabError, ParameterError

# ---------------------------------------------------------------------------
#   type:
#       'int', 'float', 'str'           - scalar
#       'ints', 'floats', 'strs'        - list, also from 'a:b[:step]' for numbers

Settings_Dict = {
    'n' :           { 'type' : 'int',    'default' : Const.Default_N,    'help' : 'Number of nodes' },
    'mu' :          { 'type' : 'float',  'default' : Const.Default_Mu,   'help' : 'Probability a node is type-1 (selects one node)' },
    'k' :           { 'type' : 'int',    'default' : Const.Default_K,    'help' : 'Selections made by a type-2 node' },
    'mu_vec' :      { 'type' : 'floats', 'default' : None,               'help' : 'Type probabilities mu_1..mu_r, overrides mu' },
    'k_vec' :       { 'type' : 'ints',   'default' : None,               'help' : 'Selection counts K_1..K_r, overrides k' },
    'd' :           { 'type' : 'int',    'default' : 0,                  'help' : 'Number of randomly deleted nodes' },
    'm' :           { 'type' : 'ints',   'default' : None,               'help' : 'Outside-count threshold M for bounds, value or range' },
    'x' :           { 'type' : 'ints',   'default' : None,               'help' : 'Outside-count threshold x for deleted-graph bounds, value or range' },
    'eps' :         { 'type' : 'float',  'default' : Const.Default_Eps,  'help' : 'Trade-off parameter of the deleted-graph bounds' },
    'c' :           { 'type' : 'float',  'default' : None,               'help' : 'Mean degree for the Erdos-Renyi comparison, default 2<K>' },
    'trials' :      { 'type' : 'int',    'default' : Const.Trials_CI,    'help' : 'Trials per sweep point' },
    'seed' :        { 'type' : 'int',    'default' : None,               'help' : 'Master seed, random when not given' },
    'out' :         { 'type' : 'str',    'default' : None,               'help' : 'Output file' },
    'format' :      { 'type' : 'str',    'default' : 'csv',              'help' : 'Output format, csv or json' },
    'sweep' :       { 'type' : 'str',    'default' : 'mu',               'help' : 'Sweep axis: mu, k, d or n' },
    'values' :      { 'type' : 'floats', 'default' : None,               'help' : 'Sweep values, list or range' },
    'overlays' :    { 'type' : 'strs',   'default' : (),                 'help' : 'Bound overlays: theorem1, theorem2, heuristic' },
    'workers' :     { 'type' : 'int',    'default' : None,               'help' : f"Worker processes, capped by cpu count and ${Const.Threads_Env}" },
}

# ---------------------------------------------------------------------------
#   '60' -> [60], '10:14' -> [10, 11, 12, 13, 14], '0.1:0.3:0.1' -> [0.1, 0.2, 0.3]

def parse_sequence( text, conv=float ):
    if isinstance( text, ( list, tuple )):
        if len( text ) == 1:
            return parse_sequence( text[0], conv )
        return [ conv( x ) for x in text ]

    text = str( text ).strip()
    if ':' not in text:
        return [ conv( x ) for x in text.replace( ',', ' ' ).split() ]

    parts = text.split( ':' )
    if len( parts ) not in ( 2, 3 ):
        raise ValueError( f"bad range '{text}'" )

    lo, hi = conv( parts[0] ), conv( parts[1] )
    step = conv( parts[2] ) if len( parts ) == 3 else conv( 1 )
    if step <= 0 or hi < lo:
        raise ValueError( f"bad range '{text}'" )

    count = int( round(( hi - lo ) / step, Const.Round_Digits )) + 1
    return [ conv( round( lo + i * step, 10 )) for i in range( count ) ]

# ---------------------------------------------------------------------------

def _int( text ):
    value = float( text )
    if value != int( value ):
        raise ValueError( f"'{text}' is not an integer" )
    return int( value )

Converters = {
    'int' :     _int,
    'float' :   float,
    'str' :     str,
    'ints' :    lambda v: parse_sequence( v, _int ),
    'floats' :  lambda v: parse_sequence( v, float ),
    'strs' :    lambda v: [ str( x ).strip() for x in ( v if isinstance( v, ( list, tuple )) else str( v ).split( ',' )) if str( x ).strip() ],
}

# ---------------------------------------------------------------------------

class Config():

    def __init__( self, path=None, overrides=None ):
        self.path = Path( path ) if path else None
        self.overrides = { k: v for k, v in ( overrides or {} ).items() if v is not None and v != () }

        if self.path:
            if not self.path.is_file():
                raise ParameterError( "readable config file", f"config file '{self.path}' not found" )
            try:
                self.config = ConfigObj( str( self.path ), file_error=True )
            except ( ConfigObjError, OSError ) as e:
                raise ParameterError( "valid config file", f"cannot parse config file '{self.path}': {e}" )
        else:
            self.config = ConfigObj()

    # -----------------------------------------------------------------------
    #   Flags, then file, then default.

    def val( self, item ):
        if item not in Settings_Dict:
            raise KoutlabError( f"ERROR-DEV: Configuration item {item} not in data dictionary" )

        dd = Settings_Dict[ item ]
        if item in self.overrides:
            raw = self.overrides[ item ]
        elif item in self.config:
            raw = self.config[ item ]
        else:
            return dd[ 'default' ]

        if isinstance( raw, str ) and raw.strip() == '':
            return dd[ 'default' ]

        try:
            return Converters[ dd[ 'type' ]]( raw )
        except ( TypeError, ValueError ) as e:
            source = 'command line' if item in self.overrides else f"config file '{self.path}'"
            raise ParameterError( f"{item} of type {dd[ 'type' ]}", f"bad value for '{item}' from {source}: {e}" )

    # -----------------------------------------------------------------------
    #   All problems at once rather than one per run.

    def validate( self ):
        errors = []

        for item in self.config:
            if item not in Settings_Dict:
                errors.append( f"unknown item '{item}' in config file '{self.path}'" )

        for item in Settings_Dict:
            try:
                self.val( item )
            except ParameterError as e:
                errors.append( e.message )

        try:
            seed = self.val( 'seed' )
        except ParameterError:
            seed = None
        if seed is not None and seed < 0:
            errors.append( f"seed must be a non-negative integer, got {seed}" )

        fmt = self.val( 'format' )
        if fmt not in Const.Formats:
            errors.append( f"format '{fmt}' not one of {', '.join( Const.Formats )}" )

        if errors:
            raise ParameterError( "valid configuration", "; ".join( errors ))

    # -----------------------------------------------------------------------

    def resolved( self ):
        return { item: self.val( item ) for item in Settings_Dict }

# ---------------------------------------------------------------------------
#   Annotated prototype config file built from Settings_Dict. No date stamp,
#       so the shipped koutlab.conf.proto only changes when a setting does.

def write_proto( path ):
    config = ConfigObj()
    config.filename = str( path )

    config.initial_comment = [
        f"{'-' * 70}",
        f"  {Const.Config_File} - {Const.Long_Title}",
        "  Built from the settings data dictionary by src/build-config-proto.py.",
        "  Edit any item, an empty value means the default. Flags override these.",
        "  Lists are comma separated, numeric lists also take a:b or a:b:step.",
        f"{'-' * 70}",
    ]

    for item, dd in Settings_Dict.items():
        default = dd[ 'default' ]
        if isinstance( default, ( list, tuple )):
            default = ', '.join( str( x ) for x in default )
        config[ item ] = '' if default is None else str( default )
        config.comments[ item ] = [ '', f"{dd[ 'help' ]}" ]

    config.write()
    return Path( path )

# ---------------------------------------------------------------------------
