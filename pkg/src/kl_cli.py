#!/usr/bin/python
# ---------------------------------------------------------------------------
#   kl_cli.py - Command-line front end.

#   koutlab [--config FILE] [-v] COMMAND [options]

#       sample      build one graph, write its edge list and component report
#       sweep       Monte-Carlo sweep of |C_max| over mu, K, d or n
#       bounds      evaluate an asymptotic or finite-n bound over an M/x grid
#       oracle      exact cut probabilities against full enumeration
#       validate    run the self-check suites

#   Options left off the command line come from the config file, then from
#       kl_config.Settings_Dict. The seed, random when not given, is always
#       echoed on stderr and written into every output file.

#   Errors: ParameterError exits 2, ValidationFailure exits 3, each with an
#       'ERROR:' line on stderr.
# ---------------------------------------------------------------------------

import sys
import json
import logging
import secrets
import functools
from pathlib import Path

import click

import kl_version
from kl_constants import Const
from kl_errors import ParameterError, ValidationFailure
from kl_config import Config
from kl_templates import render
from kl_graph_model import GraphParams, construct_r_type, delete_random_nodes
from kl_component_analysis import connected_components
from kl_oracle import oracle_agreement, cut_probability, union_bound_sum, union_bound_sum_deleted
from kl_bounds import (
    Heuristic_Note, avg_selections, theorem1_bound, theorem2_bound, alt_deleted_bound,
    corollary_r_bound, corollary_r_deleted_bound, heuristic_giant_lower_bound,
    er_giant_fraction, mean_degree_params,
)
from kl_experiments import ExperimentConfig, run_sweep, coupling_experiment, trial_rng, check_writable, resolve_workers
from kl_validate import run_validation

log = logging.getLogger( __name__ )

Bound_Kinds = ( 't1', 't2', 'alt', 'r', 'rdel', 'heuristic', 'er', 'degree', 'union', 'union-del' )

# ---------------------------------------------------------------------------

def setup_logging( verbose ):
    level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig( level=level, format=Const.Log_Format, stream=sys.stderr, force=True )

# ---------------------------------------------------------------------------
#   Library errors to 'ERROR:' lines and exit codes.

def guarded( fn ):
    @functools.wraps( fn )
    def wrapper( *args, **kwargs ):
        try:
            return fn( *args, **kwargs )

        except ValidationFailure as e:
            click.echo( f"ERROR: validation failed: {e}", err=True )
            sys.exit( Const.Exit_Validation )

        except ParameterError as e:
            click.echo( f"ERROR: {e}", err=True )
            sys.exit( Const.Exit_Param )

    return wrapper

# ---------------------------------------------------------------------------

def ensemble_options( fn ):
    options = [
        click.option( "--n", type=int,           help="Number of nodes" ),
        click.option( "--mu", type=float,        help="Probability a node is type-1" ),
        click.option( "--mu-vec",                help="Type probabilities, comma separated" ),
        click.option( "--k", type=int,           help="Selections made by a type-2 node" ),
        click.option( "--k-vec",                 help="Selection counts per type, comma separated" ),
        click.option( "--d", type=int,           help="Number of deleted nodes" ),
    ]
    for option in reversed( options ):
        fn = option( fn )
    return fn

# ---------------------------------------------------------------------------

def load_config( ctx, **flags ):
    conf = Config( ctx.obj[ 'config_path' ], overrides=flags )
    conf.validate()
    return conf

def resolve_seed( conf ):
    seed = conf.val( 'seed' )
    if seed is None:
        seed = secrets.randbelow( 2**32 )
    click.echo( f"seed: {seed}", err=True )
    return seed

def resolved_with( conf, seed ):
    resolved = conf.resolved()
    resolved[ 'seed' ] = seed
    return resolved

def has_vectors( conf ):
    return conf.val( 'mu_vec' ) is not None or conf.val( 'k_vec' ) is not None

def ensemble( conf ):
    n = conf.val( 'n' )
    if has_vectors( conf ):
        mu_vec, k_vec = conf.val( 'mu_vec' ), conf.val( 'k_vec' )
        if mu_vec is None or k_vec is None:
            raise ParameterError( "--mu-vec with --k-vec", "give both type vectors or neither" )
        return GraphParams( n, mu_vec, k_vec )
    return GraphParams.two_type( n, conf.val( 'mu' ), conf.val( 'k' ))

def dump_json( obj ):
    return json.dumps( obj, indent=2 ) + '\n'

# ===========================================================================

@click.group( context_settings=dict( max_content_width=120, help_option_names=[ '-h', '--help' ] ))
@click.option( "--config", "config_path", type=click.Path( dir_okay=False ), help="Configuration file" )
@click.option( "-v", "--verbose", count=True, help="INFO logging, -vv for DEBUG" )
@click.version_option( version=Const.Version, prog_name=Const.Program_Name )
@click.pass_context

def cli( ctx, config_path, verbose ):
    """ Giant components of inhomogeneous random K-out graphs. """
    setup_logging( verbose )
    ctx.ensure_object( dict )
    ctx.obj[ 'config_path' ] = config_path

# ---------------------------------------------------------------------------

def write_edge_list( path, g, deleted, seed, resolved ):
    lines = [
        f"# {Const.Program_Name} {kl_version.__version__} sample",
        f"# seed: {seed}",
        f"# config: {json.dumps( resolved, sort_keys=True )}",
        f"# node_types: {' '.join( str( int( t )) for t in g.node_types )}",
        f"# deleted: {' '.join( str( x ) for x in deleted )}",
    ]
    lines += [ f"{int( u )} {int( v )}" for u, v in g.edges ]
    Path( path ).write_text( '\n'.join( lines ) + '\n' )

@cli.command()
@ensemble_options
@click.option( "--seed", type=int,                      help="Master seed" )
@click.option( "--out",                                 help="Output file: edge list (csv) or full dump (json)" )
@click.option( "--format", "fmt", type=click.Choice( Const.Formats ), help="csv: edge list + json report, json: one file" )
@click.pass_context
@guarded

def sample( ctx, n, mu, mu_vec, k, k_vec, d, seed, out, fmt ):
    """ Build one graph and report its components. """
    conf = load_config( ctx, n=n, mu=mu, mu_vec=mu_vec, k=k, k_vec=k_vec, d=d, seed=seed, out=out, format=fmt )
    params = ensemble( conf )
    out, fmt = conf.val( 'out' ), conf.val( 'format' )
    if out:
        check_writable( out )

    seed = resolve_seed( conf )
    resolved = resolved_with( conf, seed )

    rng = trial_rng( seed, 0, 0 )
    g = construct_r_type( params, rng )
    spec, view = delete_random_nodes( g, conf.val( 'd' ), rng )
    report = connected_components( view )

    payload = {
        'program' :     Const.Program_Name,
        'version' :     kl_version.__version__,
        'seed' :        seed,
        'config' :      resolved,
        'node_types' :  [ int( t ) for t in g.node_types ],
        'deleted' :     list( spec.deleted_set ),
        'report' :      report.as_dict(),
    }

    files = []
    if out and fmt == 'json':
        payload[ 'edges' ] = [ [ int( u ), int( v ) ] for u, v in g.edges ]
        Path( out ).write_text( dump_json( payload ))
        files = [ out ]

    elif out:
        write_edge_list( out, g, spec.deleted_set, seed, resolved )
        report_path = Path( out ).with_suffix( '.json' )
        report_path.write_text( dump_json( payload ))
        files = [ out, str( report_path ) ]

    click.echo( render( 'sample', title=f"Sample {params.as_dict()}", seed=seed, report=report,
                        deleted=list( spec.deleted_set ), num_edges=len( g.edges ), files=files ), nl=False )

# ---------------------------------------------------------------------------

@cli.command()
@ensemble_options
@click.option( "--sweep", "axis", type=click.Choice( Const.Sweep_Params ), help="Sweep axis" )
@click.option( "--values",                              help="Sweep values: list '0.1,0.5' or range 'a:b[:step]'" )
@click.option( "--trials", type=int,                    help="Trials per point" )
@click.option( "--seed", type=int,                      help="Master seed" )
@click.option( "--out",                                 help="CSV file, a JSON mirror is written next to it" )
@click.option( "--format", "fmt", type=click.Choice( Const.Formats ), help="Format printed on stdout" )
@click.option( "--overlay", multiple=True, type=click.Choice( Const.Overlays ), help="Bound overlay, repeatable" )
@click.option( "--eps", type=float,                     help="Trade-off parameter for theorem2 overlay" )
@click.option( "--coupling", is_flag=True,              help="Coupling experiment with --mu-vec/--k-vec instead of a sweep" )
@click.pass_context
@guarded

def sweep( ctx, n, mu, mu_vec, k, k_vec, d, axis, values, trials, seed, out, fmt, overlay, eps, coupling ):
    """ Monte-Carlo sweep of the largest component. """
    conf = load_config( ctx, n=n, mu=mu, mu_vec=mu_vec, k=k, k_vec=k_vec, d=d, sweep=axis, values=values,
                        trials=trials, seed=seed, out=out, format=fmt, overlays=overlay, eps=eps )
    seed = resolve_seed( conf )
    resolved = resolved_with( conf, seed )

    mu_vec, k_vec = conf.val( 'mu_vec' ), conf.val( 'k_vec' )

    config = ExperimentConfig(
        sweep_param =   conf.val( 'sweep' ),
        values =        tuple( conf.val( 'values' ) or () ),
        n =             conf.val( 'n' ),
        mu =            conf.val( 'mu' ),
        k =             conf.val( 'k' ),
        d =             conf.val( 'd' ),
        trials =        conf.val( 'trials' ),
        seed =          seed,
        out =           conf.val( 'out' ),
        overlays =      tuple( conf.val( 'overlays' )),
        eps =           conf.val( 'eps' ),
        workers =       conf.val( 'workers' ),
        mu_vec =        tuple( mu_vec ) if mu_vec is not None else None,
        k_vec =         tuple( k_vec ) if k_vec is not None else None,
    )

    if coupling:
        report = coupling_experiment( config )
        if conf.val( 'format' ) == 'json':
            click.echo( dump_json( { 'config' : resolved, 'coupling' : report.as_dict() } ), nl=False )
        else:
            click.echo( render( 'coupling', r=report ), nl=False )
        if report.violations:
            raise ValidationFailure( "coupled graph is an edge superset", f"{report.violations} violations" )
        return

    result = run_sweep( config, resolved=resolved )

    if conf.val( 'format' ) == 'json':
        click.echo( dump_json( result.to_json() ), nl=False )
    else:
        click.echo( result.to_csv(), nl=False )

    for s in result.summaries:
        for flag in s.flags:
            click.echo( f"WARNING: {s.sweep_param}={s.value:g}: {flag}", err=True )

# ---------------------------------------------------------------------------

def _need( kind, name, values ):
    if not values:
        raise ParameterError( f"--{name} given", f"bound kind '{kind}' needs --{name}" )
    return values

def _need_vectors( kind, conf ):
    if conf.val( 'mu_vec' ) is None or conf.val( 'k_vec' ) is None:
        raise ParameterError( "--mu-vec and --k-vec given", f"bound kind '{kind}' needs both type vectors" )
    return conf.val( 'mu_vec' ), conf.val( 'k_vec' )

def _fmt( value ):
    return f"{value:.6g}"

#   Rows of { 'arg', 'value' }, the inputs shown and the notes for one kind.

def evaluate_bounds( kind, conf ):
    n, mu, k, d, eps = conf.val( 'n' ), conf.val( 'mu' ), conf.val( 'k' ), conf.val( 'd' ), conf.val( 'eps' )
    ms, xs = conf.val( 'm' ), conf.val( 'x' )
    notes = ()

    if kind == 't1':
        evals = [ ( m, theorem1_bound( mu, k, m )) for m in _need( kind, 'm', ms ) ]
        inputs, arg = { 'mu' : mu, 'K' : k }, 'M'

    elif kind == 't2':
        evals = [ ( x, theorem2_bound( mu, k, d, x, eps )) for x in _need( kind, 'x', xs ) ]
        inputs, arg = { 'mu' : mu, 'K' : k, 'd' : d, 'eps' : eps }, 'x'

    elif kind == 'alt':
        evals = [ ( x, alt_deleted_bound( mu, d, x, eps )) for x in _need( kind, 'x', xs ) ]
        inputs, arg = { 'mu' : mu, 'd' : d, 'eps' : eps }, 'x'

    elif kind == 'r':
        mu_vec, k_vec = _need_vectors( kind, conf )
        evals = [ ( m, corollary_r_bound( mu_vec, k_vec, m )) for m in _need( kind, 'm', ms ) ]
        inputs, arg = { 'mu' : mu_vec, 'K' : k_vec }, 'M'

    elif kind == 'rdel':
        mu_vec, k_vec = _need_vectors( kind, conf )
        evals = [ ( x, corollary_r_deleted_bound( mu_vec, k_vec, d, x, eps )) for x in _need( kind, 'x', xs ) ]
        inputs, arg = { 'mu' : mu_vec, 'K' : k_vec, 'd' : d, 'eps' : eps }, 'x'

    elif kind == 'heuristic':
        value = heuristic_giant_lower_bound( n, mu, k, d )
        return [ { 'arg' : d, 'value' : str( value ) } ], { 'n' : n, 'mu' : mu, 'K' : k }, 'd', ( Heuristic_Note, )

    elif kind == 'er':
        c = conf.val( 'c' )
        if c is None:
            c = 2 * avg_selections( mu, k )
        return [ { 'arg' : _fmt( c ), 'value' : _fmt( er_giant_fraction( c )) } ], {}, 'c', ( "fraction of n in the giant component",)

    elif kind == 'degree':
        params = ensemble( conf )
        value = mean_degree_params( params )
        return [ { 'arg' : n, 'value' : _fmt( value ) } ], params.as_dict(), 'n', ()

    elif kind == 'union':
        rows = []
        for m in _need( kind, 'm', ms ):
            b = union_bound_sum( n, mu, k, m )
            rows.append( { 'arg' : m, 'value' : f"{_fmt( b.value )}  (raw {_fmt( b.raw_sum )})" } )
        return rows, { 'n' : n, 'mu' : mu, 'K' : k }, 'M', ( "finite-n union bound, no o(1) terms", )

    elif kind == 'union-del':
        rows = []
        for x in _need( kind, 'x', xs ):
            b = union_bound_sum_deleted( n, mu, k, d, x )
            rows.append( { 'arg' : x, 'value' : f"{_fmt( b.value )}  (raw {_fmt( b.raw_sum )})" } )
        return rows, { 'n' : n, 'mu' : mu, 'K' : k, 'd' : d }, 'x', ( "finite-n union bound, no o(1) terms", )

    else:
        raise ParameterError( f"kind in {Bound_Kinds}", f"unknown bound kind '{kind}'" )

    rows = [ { 'arg' : a, 'value' : _fmt( b.value ) } for a, b in evals ]
    notes = evals[0][1].regime_notes if evals else notes
    return rows, inputs, arg, notes

@cli.command()
@click.option( "--kind", type=click.Choice( Bound_Kinds ), default='t1', show_default=True, help="Which bound" )
@ensemble_options
@click.option( "--m",                                   help="M, a value or range a:b" )
@click.option( "--x",                                   help="x, a value or range a:b" )
@click.option( "--eps", type=float,                     help="Trade-off parameter" )
@click.option( "--c", type=float,                       help="Mean degree for --kind er, default 2<K>" )
@click.option( "--format", "fmt", type=click.Choice( Const.Formats ), help="json for machine-readable output" )
@click.pass_context
@guarded

def bounds( ctx, kind, n, mu, mu_vec, k, k_vec, d, m, x, eps, c, fmt ):
    """ Evaluate bounds on the number of nodes outside the giant component. """
    conf = load_config( ctx, n=n, mu=mu, mu_vec=mu_vec, k=k, k_vec=k_vec, d=d, m=m, x=x, eps=eps, c=c, format=fmt )
    rows, inputs, arg, notes = evaluate_bounds( kind, conf )

    if conf.val( 'format' ) == 'json':
        click.echo( dump_json( { 'kind' : kind, 'inputs' : inputs, 'arg' : arg, 'rows' : rows, 'notes' : list( notes ) } ), nl=False )
    else:
        click.echo( render( 'bounds', title=f"Bound {kind}", inputs=inputs, arg_name=arg, rows=rows, notes=notes ), nl=False )

# ---------------------------------------------------------------------------

@cli.command()
@click.option( "--n", type=int,                         help="Number of nodes" )
@click.option( "--mu", type=float,                      help="Probability a node is type-1" )
@click.option( "--k", type=int,                         help="Selections made by a type-2 node" )
@click.option( "--d", type=int,                         help="Number of deleted nodes" )
@click.option( "--m",                                   help="Union-bound lower limits, a value or range a:b" )
@click.option( "--format", "fmt", type=click.Choice( Const.Formats ), help="json for machine-readable output" )
@click.pass_context
@guarded

def oracle( ctx, n, mu, k, d, m, fmt ):
    """ Exact cut probabilities, checked against enumeration for n <= 7. """
    conf = load_config( ctx, n=n, mu=mu, k=k, d=d, m=m, format=fmt )
    n, mu, k, d = conf.val( 'n' ), conf.val( 'mu' ), conf.val( 'k' ), conf.val( 'd' )
    params = GraphParams.two_type( n, mu, k )

    skipped = ''
    if n <= Const.Max_Exhaustive_Nodes:
        rows = oracle_agreement( n, mu, k, d )
        table = [ { 'r' : r.r, 'exact' : repr( r.exact ), 'enumerated' : repr( r.enumerated ), 'diff' : f"{r.abs_diff:.3g}" } for r in rows ]
    else:
        rows = []
        last = min( n - d - 1, 30 )
        table = [ { 'r' : r, 'exact' : repr( cut_probability( params, r, d=d )), 'enumerated' : '-', 'diff' : '-' } for r in range( 1, last + 1 ) ]
        skipped = f"n={n} above {Const.Max_Exhaustive_Nodes}"

    hi = ( n - d ) // 2
    m_values = conf.val( 'm' ) or range( 1, min( hi, 30 ) + 1 )
    sums = []
    for lo in m_values:
        b = union_bound_sum_deleted( n, mu, k, d, lo )
        sums.append( { 'm' : lo, 'raw' : repr( b.raw_sum ), 'value' : repr( b.value ) } )

    if conf.val( 'format' ) == 'json':
        click.echo( dump_json( { 'n' : n, 'mu' : mu, 'K' : k, 'd' : d, 'rows' : table, 'sums' : sums, 'skipped' : skipped } ), nl=False )
    else:
        click.echo( render( 'oracle', n=n, mu=mu, k=k, d=d, rows=table, sums=sums, skipped=skipped ), nl=False )

    bad = [ r for r in rows if r.abs_diff > Const.Oracle_Tolerance ]
    if bad:
        raise ValidationFailure( "exact cut product equals enumeration", f"r={bad[0].r} differs by {bad[0].abs_diff:.3g}" )

# ---------------------------------------------------------------------------

@cli.command()
@click.option( "--level", type=click.Choice( Const.Validate_Levels ), default='quick', show_default=True, help="full adds Monte-Carlo gates" )
@click.option( "--only", multiple=True,                 help="Run only the named suite, repeatable" )
@click.option( "--seed", type=int,                      help="Seed for the statistical suites" )
@click.option( "--format", "fmt", type=click.Choice( Const.Formats ), help="json for machine-readable output" )
@click.pass_context
@guarded

def validate( ctx, level, only, seed, fmt ):
    """ Run the self-check suites. """
    conf = load_config( ctx, seed=seed, format=fmt )
    seed = resolve_seed( conf )

    report = run_validation( level=level, seed=seed, workers=resolve_workers( conf.val( 'workers' )), only=set( only ))

    if conf.val( 'format' ) == 'json':
        click.echo( dump_json( report.as_dict() ), nl=False )
    else:
        click.echo( render( 'validation', level=level, seed=seed, suites=report.suites,
                            passed=len( report.suites ) - len( report.failures )), nl=False )

    if report.failures:
        first = report.failures[0]
        raise ValidationFailure( first.invariant, first.detail )

# ---------------------------------------------------------------------------

def main( argv=None ):
    return cli.main( args=argv, prog_name=Const.Program_Name )

# ---------------------------------------------------------------------------
