package sim;

public class Observer {
    public void record(String label) {
    }

    public void emit(Observer target) {
        String tag = "x";
        String pad = tag + tag;
        target.record(pad);
        pad = tag;
    }
}

class ObserverMirror {
    public void emit(Observer target) {
        String tag = "x";
        String pad = tag + tag;
        target.record(pad);
        pad = tag;
    }
}
