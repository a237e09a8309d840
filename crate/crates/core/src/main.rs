fn main() {
    std::process::exit(cdc_bounds::cli::main_with_args(std::env::args_os()));
}
