fn main() {
    std::process::exit(vo_tfmid::cli::main_with_args(std::env::args_os()));
}
