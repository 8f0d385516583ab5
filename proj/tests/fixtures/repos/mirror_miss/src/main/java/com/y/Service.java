package com.y;

public class Service {
    public boolean start() {
        return true;
    }
}
