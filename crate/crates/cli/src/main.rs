fn main() {
    let out = ainfty_cli::run_from(std::env::args_os());
    if out.code == 2 && !out.report.starts_with("$ ") {
        eprint!("{}", out.report);
    } else {
        print!("{}", out.report);
    }
    std::process::exit(out.code);
}
