# Tests for linkspace
