# Verification harness and command line for the Bell toolkit
