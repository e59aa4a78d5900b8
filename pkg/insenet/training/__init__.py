"""Training loop, loss and normalization statistics."""
