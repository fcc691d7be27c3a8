use std::process::exit;

fn main() {
    exit(klrpoly::cli::run());
}
