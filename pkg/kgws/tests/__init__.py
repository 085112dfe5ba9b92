# Tests for kgws
