from .model import Program, Rule, Atom, Predicate, Dataset, Renaming
import wlrewrite.errors
import wlrewrite.model
import wlrewrite.io
import wlrewrite.analysis
import wlrewrite.engine
import wlrewrite.oracle
import wlrewrite.xi
import wlrewrite.psi
import wlrewrite.unfold
import wlrewrite.rlor
import wlrewrite.harness
import wlrewrite.metrics


# Needs to be last line
__version__ = '0.1.0'
