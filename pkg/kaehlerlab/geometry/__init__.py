"""Model ambients, immersions and the curvature identities checked on them."""
