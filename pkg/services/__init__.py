# Services module