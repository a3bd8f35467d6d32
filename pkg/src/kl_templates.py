#!/usr/bin/python
# ---------------------------------------------------------------------------
#   kl_templates.py - Text reports, rendered with jinja2.

#   Templates are kept here as strings and compiled once on first use.
#       Callers pass plain dicts and lists, see render().
# ---------------------------------------------------------------------------

from functools import lru_cache

from jinja2 import Template

# ---------------------------------------------------------------------------

Sample_Report = """\
{{ title }}
  seed:            {{ seed }}
  n:               {{ report.n_effective + deleted|length }}
  deleted:         {{ deleted|length }}{% if deleted %} ({{ deleted|join(' ') }}){% endif %}
  n_effective:     {{ report.n_effective }}
  edges:           {{ num_edges }}
  components:      {{ report.num_components }}
  cmax:            {{ report.cmax }}
  outside_count:   {{ report.outside_count }}
{% if files %}  written:         {{ files|join(', ') }}
{% endif %}"""

# ---------------------------------------------------------------------------

Bounds_Table = """\
{{ title }}
{% for k, v in inputs.items() %}  {{ '%-8s'|format(k) }} {{ v }}
{% endfor %}
  {{ '%-10s'|format(arg_name) }} {{ '%-16s'|format('value') }}
  {{ '-' * 10 }} {{ '-' * 16 }}
{% for row in rows %}  {{ '%-10s'|format(row.arg) }} {{ row.value }}
{% endfor %}{% if notes %}
  notes:
{% for note in notes %}    - {{ note }}
{% endfor %}{% endif %}"""

# ---------------------------------------------------------------------------

Oracle_Table = """\
Exact cut probabilities, n={{ n }} mu={{ mu }} K={{ k }} d={{ d }}
  {{ '%-4s'|format('r') }} {{ '%-24s'|format('exact') }} {{ '%-24s'|format('enumerated') }} abs_diff
{% for row in rows %}  {{ '%-4s'|format(row.r) }} {{ '%-24s'|format(row.exact) }} {{ '%-24s'|format(row.enumerated) }} {{ row.diff }}
{% endfor %}{% if skipped %}  enumeration skipped: {{ skipped }}
{% endif %}
Union-bound sums
  {{ '%-4s'|format('M') }} {{ '%-24s'|format('raw_sum') }} value
{% for row in sums %}  {{ '%-4s'|format(row.m) }} {{ '%-24s'|format(row.raw) }} {{ row.value }}
{% endfor %}"""

# ---------------------------------------------------------------------------

Coupling_Report = """\
Coupling, n={{ r.n }} trials={{ r.trials }} seed={{ r.seed }}
  edge superset violations:   {{ r.edge_violations }}
  cmax violations:            {{ r.cmax_violations }}
  avg cmax two-type:          {{ '%.4f'|format(r.avg_cmax_base) }}
  avg cmax extended:          {{ '%.4f'|format(r.avg_cmax_extended) }}
"""

# ---------------------------------------------------------------------------

Validation_Report = """\
Validation level={{ level }} seed={{ seed }}
{% for s in suites %}  {{ 'PASS' if s.passed else 'FAIL' }}  {{ '%-22s'|format(s.name) }} {{ '%7.2fs'|format(s.wall_time) }}  {{ s.invariant }}
{% if s.detail %}        {{ s.detail }}
{% endif %}{% endfor %}
{{ passed }} of {{ suites|length }} suites passed
"""

# ---------------------------------------------------------------------------

Templates = {
    'sample' :      Sample_Report,
    'bounds' :      Bounds_Table,
    'oracle' :      Oracle_Table,
    'coupling' :    Coupling_Report,
    'validation' :  Validation_Report,
}

@lru_cache( maxsize=None )
def _template( name ):
    return Template( Templates[ name ], keep_trailing_newline=True )

def render( name, **kwargs ):
    return _template( name ).render( **kwargs )

# ---------------------------------------------------------------------------
