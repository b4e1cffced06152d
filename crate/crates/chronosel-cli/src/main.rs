fn main() { println!("chronosel"); }
