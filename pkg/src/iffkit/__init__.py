"""iffkit: a toolkit for the IFF ontology metalanguage.

The package is organised in layers:

* ``syntax``     -- lexer, parser, and canonical printer for the
  restricted-quantification s-expression dialect.
* ``names``      -- metalevel algebra, qualified-name resolution, and the
  symbol table.
* ``checks``     -- diagnostics, axiom-form classification, and the static
  checks (restricted quantification, stratification, conceptual warrant).
* ``finset``     -- a small kernel of finite sets, functions, predicates,
  relations, spans, and categories, with the topos-flavoured operations
  (power sets, exponents, subobject classifier) checked by enumeration.
* ``modelcheck`` -- interpretations of theories in the finite-set kernel,
  exhaustive truth evaluation, and the Cantor / fixed-point suites.
* ``metastack``  -- bounded stratified set universes, union operators,
  closure-property checks, and the kernel orders.
* ``cli``        -- the ``iffkit`` command-line front end.
"""

__version__ = "0.1.0"
