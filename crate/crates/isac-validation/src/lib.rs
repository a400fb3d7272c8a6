//! Holds the `acceptance` test target. It sits in its own crate so a red
//! criterion cannot stop cargo before the other crates' suites have run.
