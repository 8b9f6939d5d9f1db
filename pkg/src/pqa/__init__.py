"""Two-layer typed lambda calculus for circuit description: checker, normalizer, renderer."""
