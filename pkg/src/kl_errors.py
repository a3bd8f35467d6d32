#!/usr/bin/python
# ---------------------------------------------------------------------------
#   kl_errors.py - Exceptions raised by the library modules.

#   Library code only raises. kl_cli.py converts these to an 'ERROR:' line
#       on stderr and an exit code, see Const.Exit_*.
# ---------------------------------------------------------------------------

class KoutlabError( Exception ):
    pass

# ---------------------------------------------------------------------------
#   'condition' is the violated precondition, written the way a user would
#       check it, e.g. 'K_r < n'. str() always names it.

class ParameterError( KoutlabError, ValueError ):
    def __init__( self, condition, message=None ):
        self.condition = condition
        self.message = message or f"violated precondition {condition}"
        super().__init__( self.message )

    def __str__( self ):
        if self.condition in self.message:
            return self.message
        return f"{self.message} (requires {self.condition})"

# ---------------------------------------------------------------------------

class BudgetError( ParameterError ):
    pass

# ---------------------------------------------------------------------------

class ValidationFailure( KoutlabError ):
    def __init__( self, invariant, detail='' ):
        self.invariant = invariant
        self.detail = detail
        super().__init__( f"{invariant}: {detail}" if detail else invariant )

# ---------------------------------------------------------------------------
