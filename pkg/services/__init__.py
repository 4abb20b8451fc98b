"""Services for the positive-map audit toolkit."""
