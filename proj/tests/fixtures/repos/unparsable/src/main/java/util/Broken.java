package util;

public class Broken {
    public void oops( {
        return;
    }
}
