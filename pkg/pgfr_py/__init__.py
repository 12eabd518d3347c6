# Exact certification of pretty good fractional revival on paths and double stars.
