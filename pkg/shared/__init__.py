# Shared modules for the prefopt optimizer