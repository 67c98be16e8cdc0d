# runtime/__init__.py
