//! Runs every property suite, or the suites matching the first argument.

use vo_tfmid::properties::{properties_suite, PropertyContext};

fn main() {
    let filter = std::env::args().nth(1);
    let summary = properties_suite(&PropertyContext::default(), filter.as_deref());
    println!("{summary}");
    if !summary.all_passed() {
        std::process::exit(1);
    }
}
