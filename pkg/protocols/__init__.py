# protocols/__init__.py
