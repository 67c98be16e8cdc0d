# search/__init__.py
