#!/usr/bin/python
# ------------------------------------------------------------------------
#   test_cli.py - Command line, through click's test runner.
# ------------------------------------------------------------------------

import csv
import io
import json

import pytest
from click.testing import CliRunner

from kl_constants import Const
from kl_cli import cli

# ------------------------------------------------------------------------
#   Keep stdout and stderr apart on every click version.

def make_runner():
    try:
        return CliRunner( mix_stderr=False )
    except TypeError:
        return CliRunner()

@pytest.fixture
def run( threads_env ):
    threads_env( 1 )
    runner = make_runner()

    def invoke( *args ):
        return runner.invoke( cli, [ str( a ) for a in args ] )
    return invoke

# ------------------------------------------------------------------------

def test_version( run ):
    result = run( '--version' )
    assert result.exit_code == 0
    assert Const.Program_Name in result.output

# ------------------------------------------------------------------------

def test_bounds_er( run ):
    result = run( 'bounds', '--kind', 'er', '--c', 2.2 )
    assert result.exit_code == 0, result.stderr
    assert "0.8437" in result.stdout

def test_bounds_er_near_one( run ):
    result = run( 'bounds', '--kind', 'er', '--c', '1.000000001' )
    assert result.exit_code == 0, result.stderr
    assert "2e-09" in result.stdout

def test_bounds_theorem1( run ):
    result = run( 'bounds', '--kind', 't1', '--mu', 0.9, '--k', 2, '--m', 60 )
    assert result.exit_code == 0, result.stderr
    assert "0.02604" in result.stdout
    assert "notes:" in result.stdout

def test_bounds_json_range( run ):
    result = run( 'bounds', '--kind', 't1', '--m', '1:3', '--format', 'json' )
    assert result.exit_code == 0, result.stderr
    data = json.loads( result.stdout )
    assert [ row['arg'] for row in data['rows'] ] == [ 1, 2, 3 ]
    assert data['arg'] == 'M'

def test_bounds_theorem2_hypothesis( run ):
    result = run( 'bounds', '--kind', 't2', '--mu', 0.9, '--k', 2, '--d', 20, '--x', 400, '--eps', 1 )
    assert result.exit_code == Const.Exit_Param
    assert result.stderr.startswith( "ERROR:" )
    assert "x must exceed 400" in result.stderr

    result = run( 'bounds', '--kind', 't2', '--mu', 0.9, '--k', 2, '--d', 20, '--x', 401, '--eps', 1 )
    assert result.exit_code == 0, result.stderr

def test_bounds_missing_inputs( run ):
    assert run( 'bounds', '--kind', 'r', '--m', 10 ).exit_code == Const.Exit_Param
    assert run( 'bounds', '--kind', 't1' ).exit_code == Const.Exit_Param

def test_bounds_other_kinds( run ):
    result = run( 'bounds', '--kind', 'heuristic', '--n', 1000, '--d', 20 )
    assert "780" in result.stdout

    result = run( 'bounds', '--kind', 'r', '--mu-vec', '0.4,0.4,0.2', '--k-vec', '1,2,4', '--m', 10 )
    assert result.exit_code == 0, result.stderr
    assert "0.00549" in result.stdout

    result = run( 'bounds', '--kind', 'degree', '--n', 2000 )
    assert "2.1993" in result.stdout

    result = run( 'bounds', '--kind', 'union', '--n', 200, '--m', '5:6' )
    assert result.exit_code == 0, result.stderr
    assert "raw" in result.stdout

# ------------------------------------------------------------------------

def test_sample_small_graph_connected( run ):
    result = run( 'sample', '--n', 3, '--k', 2, '--seed', 1 )
    assert result.exit_code == 0, result.stderr
    assert "cmax:            3" in result.stdout
    assert "seed: 1" in result.stderr

def test_sample_random_seed_is_echoed( run ):
    result = run( 'sample', '--n', 20 )
    assert result.exit_code == 0, result.stderr
    assert "seed: " in result.stderr

def test_negative_seed_is_a_parameter_error( run ):
    for args in (( 'sample', '--n', 20 ), Sweep_Args[:-2], ( 'validate', '--only', 'bound_identities' )):
        result = run( *args, '--seed', -1 )
        assert result.exit_code == Const.Exit_Param
        assert result.stderr.startswith( "ERROR:" )
        assert "non-negative" in result.stderr

def test_sample_files( run, tmp_path ):
    out = tmp_path / 'g.csv'
    result = run( 'sample', '--n', 1000, '--d', 20, '--seed', 5, '--out', out )
    assert result.exit_code == 0, result.stderr
    assert "n_effective:     980" in result.stdout

    lines = out.read_text().splitlines()
    assert "# seed: 5" in lines
    edges = [ line.split() for line in lines if not line.startswith( '#' ) ]
    assert all( len( e ) == 2 and int( e[0] ) < int( e[1] ) for e in edges )

    report = json.loads( out.with_suffix( '.json' ).read_text() )
    assert report['seed'] == 5
    assert report['report']['n_effective'] == 980
    assert len( report['deleted'] ) == 20
    assert report['config']['d'] == 20

def test_sample_json( run, tmp_path ):
    out = tmp_path / 'g.json'
    result = run( 'sample', '--n', 50, '--seed', 2, '--format', 'json', '--out', out )
    assert result.exit_code == 0, result.stderr
    data = json.loads( out.read_text() )
    assert len( data['node_types'] ) == 50
    assert all( u < v for u, v in data['edges'] )

def test_sample_errors( run, tmp_path ):
    assert run( 'sample', '--n', 3, '--k', 3 ).exit_code == Const.Exit_Param
    assert run( 'sample', '--mu-vec', '0.5,0.5' ).exit_code == Const.Exit_Param
    result = run( 'sample', '--out', tmp_path / 'nope' / 'g.csv' )
    assert result.exit_code == Const.Exit_Param
    assert "does not exist" in result.stderr

# ------------------------------------------------------------------------

Sweep_Args = ( 'sweep', '--sweep', 'mu', '--values', '0.5,0.9', '--n', 200, '--trials', 30, '--seed', 7 )

def test_sweep_csv_and_files( run, tmp_path ):
    out = tmp_path / 's.csv'
    result = run( *Sweep_Args, '--out', out )
    assert result.exit_code == 0, result.stderr
    assert result.stdout == out.read_text()

    rows = list( csv.reader( io.StringIO( result.stdout )))
    assert rows[0] == Const.CSV_Header
    assert [ r[1] for r in rows[1:] ] == [ '0.5', '0.9' ]

    mirror = json.loads( out.with_suffix( '.json' ).read_text() )
    assert mirror['seed'] == 7
    assert mirror['config']['seed'] == 7
    assert len( mirror['points'] ) == 2

def test_sweep_same_for_any_worker_count( run, threads_env ):
    one = run( *Sweep_Args )
    threads_env( 2 )
    two = run( *Sweep_Args )
    assert one.exit_code == 0 and two.exit_code == 0
    assert one.stdout == two.stdout

def test_sweep_json( run ):
    result = run( *Sweep_Args, '--format', 'json', '--overlay', 'heuristic' )
    assert result.exit_code == 0, result.stderr
    data = json.loads( result.stdout )
    assert data['points'][0]['overlays']['heuristic']['lower_bound'] == 200

def test_sweep_errors( run ):
    assert run( 'sweep', '--sweep', 'k', '--values', '2.5', '--trials', 5 ).exit_code == Const.Exit_Param
    assert run( 'sweep', '--sweep', 'd', '--values', '1000', '--trials', 5 ).exit_code == Const.Exit_Param
    assert run( 'sweep', '--trials', 5 ).exit_code == Const.Exit_Param           # no values

def test_sweep_coupling( run ):
    result = run( 'sweep', '--coupling', '--n', 100, '--mu-vec', '0.5,0.3,0.2', '--k-vec', '1,2,4', '--trials', 20, '--seed', 1 )
    assert result.exit_code == 0, result.stderr
    assert "edge superset violations:   0" in result.stdout

# ------------------------------------------------------------------------

def test_oracle_small( run ):
    result = run( 'oracle', '--n', 5, '--mu', 0.5, '--k', 2, '--format', 'json' )
    assert result.exit_code == 0, result.stderr
    data = json.loads( result.stdout )
    assert [ row['r'] for row in data['rows'] ] == [ 1, 2, 3 ]
    assert all( row['enumerated'] != '-' for row in data['rows'] )
    assert data['skipped'] == ''

def test_oracle_large( run ):
    result = run( 'oracle', '--n', 50, '--m', '3:4' )
    assert result.exit_code == 0, result.stderr
    assert "enumeration skipped" in result.stdout
    assert "Union-bound sums" in result.stdout

# ------------------------------------------------------------------------

def test_validate_only( run ):
    result = run( 'validate', '--only', 'bound_identities', '--only', 'er_residual', '--seed', 1 )
    assert result.exit_code == 0, result.stderr
    assert "2 of 2 suites passed" in result.stdout

def test_validate_unknown_suite( run ):
    assert run( 'validate', '--only', 'nonesuch' ).exit_code == Const.Exit_Param

# ------------------------------------------------------------------------

def test_config_file( run, tmp_path ):
    conf = tmp_path / 'koutlab.conf'
    conf.write_text( "n = 3\nseed = 11\n" )
    result = run( '--config', conf, 'sample' )
    assert result.exit_code == 0, result.stderr
    assert "cmax:            3" in result.stdout
    assert "seed: 11" in result.stderr

    conf.write_text( "n = 3\nflavour = mint\n" )
    result = run( '--config', conf, 'sample' )
    assert result.exit_code == Const.Exit_Param
    assert "flavour" in result.stderr

def test_missing_config_file( run, tmp_path ):
    assert run( '--config', tmp_path / 'none.conf', 'sample' ).exit_code == Const.Exit_Param

# ------------------------------------------------------------------------
