fn main() {
    std::process::exit(spheroidal_cli::main_for(spheroidal::SpheroidalKind::Oblate));
}
