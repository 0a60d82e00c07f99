fn main() { std::process::exit(retset::cli::run_from_env()); }
