"""
Shared helpers: error types, validators, the component registry and
small numeric utilities.
"""
