fn main() { std::process::exit(homcount::cli::main_entry()); }
