# quantum/__init__.py
