# This file makes the config directory a Python package; settings live in config.config
