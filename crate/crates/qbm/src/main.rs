use std::process::exit;

fn main() {
    exit(qbm::cli::run());
}
