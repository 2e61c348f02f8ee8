# Tests for ple_estimation package
