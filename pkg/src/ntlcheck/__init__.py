"""Model checking and satisfiability for NTL over dynamic pushdown networks."""
